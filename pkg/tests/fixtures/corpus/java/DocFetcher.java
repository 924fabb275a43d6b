package bench.cases;

import java.io.File;
import java.io.FileInputStream;
import java.io.IOException;
import java.io.InputStream;
import javax.servlet.http.*;

public class DocFetcher extends HttpServlet {

    protected void doGet(HttpServletRequest request, HttpServletResponse response) throws IOException {
        String docName = request.getParameter("doc");
        File target = new File("/srv/docs", docName);
        InputStream stream = new FileInputStream(target);
        int next = stream.read();
        while (next >= 0) {
            response.getOutputStream().write(next);
            next = stream.read();
        }
        stream.close();
    }
}
